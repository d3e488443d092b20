fn main() {
    std::process::exit(facecap_cli::main_with_args(std::env::args_os()));
}
