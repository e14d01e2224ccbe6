"""Smoke test for the cone_propagator extension module.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml --release`.
"""

import json
import math

import cone_propagator as cp


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b}"


def main():
    flat = cp.ConeParams(1.0, n=3, c=0.0)
    r = cp.eval_series(flat, 10.0, 1.0)
    close(abs(r.value), math.sqrt(2 / math.pi), 1e-8)
    assert r.terms_used > 0 and r.tail_bound < 1e-9

    k = cp.eval_kernel(flat, 1.0, 1.0, 1.0, 0.0)
    close(abs(k), (4 * math.pi) ** -1.5, 1e-10)

    try:
        cp.ConeParams(1.0, n=3, c=-0.3)
    except ValueError as e:
        assert "c > -((n-2)/2)^2" in str(e)
    else:
        raise AssertionError("subcritical coupling accepted")

    (mu0, q, freq), = cp.conjugate_frequencies(1 / 3, 1, "0") + cp.conjugate_frequencies(1 / 3, -1, "0")
    close(mu0, math.sqrt(3) / 2, 1e-12)
    close(freq, 0.5, 1e-12)
    assert cp.q_bound(1 / 3) == 3
    assert json.loads(cp.classify(2.0))["rho_at_least_one"]

    cone = cp.ConeParams(2 / 3, n=3, c=0.0)
    terms = cp.principal_terms(cone, "pi")
    assert terms and all(abs(t.frequency - 0.5) < 1e-12 for t in terms)
    try:
        cp.principal_terms(cp.ConeParams(0.5, n=3, c=0.0), "0")
    except NotImplementedError:
        pass
    else:
        raise AssertionError("excluded regime accepted")

    xs = [100.0 + 4.0 * i for i in range(100)]
    table = cp.scan(cone, xs, [math.pi], with_prediction=True)
    assert len(table) == len(xs) and table.failed_rows() == 0
    assert table.to_csv().splitlines()[0].startswith("x,phi,re,im,modulus")
    residual = max(r for _, r in table.residuals(math.pi))
    peak = max(m for _, m in table.moduli(math.pi))
    assert residual < 0.2 * peak, (residual, peak)
    report = json.loads(cp.verify_bound(table, "interior", 10.0))
    assert report["rows_checked"] == len(xs)

    fit = cp.fit_decay_exponent([(x, 3.0 * x**0.5) for x in xs])
    close(fit.slope, 0.5, 1e-12)

    step = 0.2
    samples = [(200 + step * i, complex(math.cos(0.5 * (200 + step * i)), 0.0)) for i in range(512)]
    close(cp.dominant_frequency(samples), 0.5, 0.01)

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
