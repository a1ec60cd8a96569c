fn main() {
    std::process::exit(uavsim::cli::main_with_args(std::env::args_os()));
}
