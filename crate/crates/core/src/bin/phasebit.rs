fn main() {
    std::process::exit(phasebit::cli::main_with_args(std::env::args_os()));
}
