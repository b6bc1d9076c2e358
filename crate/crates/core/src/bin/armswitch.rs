fn main() {
    std::process::exit(armswitch::harness::cli::main_with_args(std::env::args_os()));
}
