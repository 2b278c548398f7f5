fn main() {
    std::process::exit(dantzig_kit::cli::main_with_args(std::env::args_os()));
}
