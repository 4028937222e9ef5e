fn main() {
    std::process::exit(hitr::cli::main_with_args(std::env::args_os()));
}
