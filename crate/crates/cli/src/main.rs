fn main() {
    std::process::exit(cone_propagator_cli::main_with_args(std::env::args_os()));
}
