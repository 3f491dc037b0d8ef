fn main() {
    std::process::exit(qcbound_cli::cli::main_with_args(std::env::args_os()));
}
