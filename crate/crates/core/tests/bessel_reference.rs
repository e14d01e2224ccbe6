#![allow(clippy::excessive_precision)]

//! Bessel values against 40-digit reference values from an independent
//! arbitrary-precision implementation.

use cone_propagator::specfun::{bessel_j, Tolerance};

#[rustfmt::skip]
const REFERENCE: &[(f64, f64, f64)] = &[
    (0.0, 0.5, 0.93846980724081290423),
    (0.0, 5.0, -0.17759677131433830435),
    (0.0, 11.9, 0.02504944169958964508),
    (0.0, 12.1, 0.069666773606807311849),
    (0.0, 30.0, -0.086367983581040211336),
    (0.0, 99.0, -0.05447423527049907344),
    (0.0, 250.0, -0.026053373425204233664),
    (0.0, 700.0, -0.0062882724650687667615),
    (0.0, 1500.0, -0.016085852188690328857),
    (0.0, 2000.0, 0.0070983418331996167598),
    (0.3, 0.5, 0.70026048850705467274),
    (0.3, 5.0, -0.29682911012576075751),
    (0.3, 11.9, -0.081220674389241633645),
    (0.3, 12.1, -0.036262204172314094621),
    (0.3, 30.0, -0.13011079142417547186),
    (0.3, 99.0, -0.075240486451261085312),
    (0.3, 250.0, -0.042828975591490380459),
    (0.3, 700.0, 0.0077853713336169849634),
    (0.3, 1500.0, -0.020175713481122294471),
    (0.3, 2000.0, 0.013755496172700505202),
    (1.0, 0.5, 0.24226845767487388638),
    (1.0, 5.0, -0.32757913759146522204),
    (1.0, 11.9, -0.22898324966192405505),
    (1.0, 12.1, -0.21574897337692480827),
    (1.0, 30.0, -0.11875106261662293652),
    (1.0, 99.0, -0.059122942553074067037),
    (1.0, 250.0, -0.043269038410330749511),
    (1.0, 700.0, 0.02948982408403033108),
    (1.0, 1500.0, -0.012876202473191770333),
    (1.0, 2000.0, 0.016370141522854216711),
    (2.5, 0.5, 0.0092364078193797244999),
    (2.5, 5.0, 0.24037720111131735285),
    (2.5, 11.9, 0.094107747102813510092),
    (2.5, 12.1, 0.050228216053957650821),
    (2.5, 30.0, 0.14120285879928212036),
    (2.5, 99.0, 0.080005519931744925593),
    (2.5, 250.0, 0.048827134469459657721),
    (2.5, 700.0, -0.0162960782203442577),
    (2.5, 1500.0, 0.020480179216408216244),
    (2.5, 2000.0, -0.016583212741592779796),
    (7.7, 0.5, 1.0766463738060350617e-9),
    (7.7, 5.0, 0.025731972535320586023),
    (7.7, 11.9, -0.0031335956713807086172),
    (7.7, 12.1, -0.043151211942666771325),
    (7.7, 30.0, 0.10929216281618048636),
    (7.7, 99.0, 0.0019263772119979517764),
    (7.7, 250.0, 0.0023872190390990032019),
    (7.7, 700.0, -0.019968354477624119491),
    (7.7, 1500.0, -0.0081168051702953390659),
    (7.7, 2000.0, -0.0013702309216429870073),
    (49.5, 0.5, 3.6727280971903947501e-94),
    (49.5, 5.0, 1.0273352081104649639e-44),
    (49.5, 11.9, 2.5091000903638454001e-26),
    (49.5, 12.1, 5.5892364764082952601e-26),
    (49.5, 30.0, 3.5812509090898131064e-8),
    (49.5, 99.0, -0.01081543117974047942),
    (49.5, 250.0, 0.045958435003151740351),
    (49.5, 700.0, 0.011625688542777459289),
    (49.5, 1500.0, -0.013373554589748763567),
    (49.5, 2000.0, 0.014906336688890090668),
    (100.2, 0.5, 2.0081542028223625283e-219),
    (100.2, 5.0, 2.9938884697403955231e-119),
    (100.2, 11.9, 1.2130737323649807047e-81),
    (100.2, 12.1, 6.3680722946086425855e-81),
    (100.2, 30.0, 3.1436025630250074412e-42),
    (100.2, 99.0, 0.074037876947176193111),
    (100.2, 250.0, 0.032174311339004962873),
    (100.2, 700.0, -0.021671303602150136398),
    (100.2, 1500.0, 0.017397002051366935324),
    (100.2, 2000.0, -0.017436096585486907571),
    (500.5, 0.5, 1.7088391085153268907e-1437),
    (500.5, 5.0, 5.3375602256268538625e-937),
    (500.5, 11.9, 1.5096000655228604694e-748),
    (500.5, 12.1, 6.3189691448285032041e-745),
    (500.5, 30.0, 1.0058218257493006434e-547),
    (500.5, 99.0, 3.8136162563639571255e-290),
    (500.5, 250.0, 1.1950114312948913312e-100),
    (500.5, 700.0, 0.029831405028176926602),
    (500.5, 1500.0, 0.017125204679971532785),
    (500.5, 2000.0, 0.01589008816737038092),
    (1000.3, 0.5, 1.7973583743559718787e-3171),
    (1000.3, 5.0, 3.5641088794635340971e-2171),
    (1000.3, 11.9, 1.6952607684851379503e-1794),
    (1000.3, 12.1, 2.946432273695941253e-1787),
    (1000.3, 30.0, 6.9463587902493092882e-1393),
    (1000.3, 99.0, 3.505916442423489463e-875),
    (1000.3, 250.0, 1.5974724326191086782e-478),
    (1000.3, 700.0, 1.8043980013376860868e-81),
    (1000.3, 1500.0, 0.020557477876114027091),
    (1000.3, 2000.0, 0.0084636914107438750591),
    (1999.7, 0.5, 3.3908066314755843521e-6939),
    (1999.7, 5.0, 1.6941813411310054814e-4939),
    (1999.7, 11.9, 1.8347323446592174899e-4186),
    (1999.7, 12.1, 5.4696376272836357229e-4172),
    (1999.7, 30.0, 1.7804491555910511646e-3383),
    (1999.7, 99.0, 4.3617005416507936586e-2347),
    (1999.7, 250.0, 1.8291298043513294268e-1545),
    (1999.7, 700.0, 6.7147629707767337197e-675),
    (1999.7, 1500.0, 6.5412017086063104543e-119),
    (1999.7, 2000.0, 0.036279813068224332015),
    (2050.1, 0.5, 3.4585951378590793336e-7136),
    (2050.1, 5.0, 4.340998150025227539e-5086),
    (2050.1, 11.9, 4.4857654191400362571e-4314),
    (2050.1, 12.1, 3.0977374527277636601e-4299),
    (2050.1, 30.0, 7.5709293616194392881e-3491),
    (2050.1, 99.0, 2.5897565683720392719e-2428),
    (2050.1, 250.0, 2.4140784371516900634e-1606),
    (2050.1, 700.0, 1.2168409880207354098e-712),
    (2050.1, 1500.0, 9.771623893897432672e-137),
    (2050.1, 2000.0, 0.000010655604758100074033),
    (2600.4, 0.5, 1.4638942640968682965e-9319),
    (2600.4, 5.0, 3.6684003609431544159e-6719),
    (2600.4, 11.9, 6.4614343488281357954e-5740),
    (2600.4, 12.1, 4.2942484247205516428e-5721),
    (2600.4, 30.0, 1.0776260134741730802e-4695),
    (2600.4, 99.0, 1.0105232506536400236e-3347),
    (2600.4, 250.0, 9.027378287965921762e-2304),
    (2600.4, 700.0, 5.2032684640057620668e-1159),
    (2600.4, 1500.0, 5.5946775229529058514e-376),
    (2600.4, 2000.0, 1.6795520042464866688e-135),
];

#[test]
fn matches_reference_table() {
    let tol = Tolerance::default();
    let mut worst: f64 = 0.0;
    for &(nu, x, expected) in REFERENCE {
        let got = bessel_j(nu, x, tol).unwrap();
        let err = (got - expected).abs();
        let allowed = tol.allowed(expected);
        worst = worst.max(err / allowed);
        assert!(
            err <= allowed,
            "J_{nu}({x}): got {got:e}, expected {expected:e}, err {err:e}"
        );
    }
    println!("worst error / allowed = {worst:.3e}");
}
