fn main() {
    std::process::exit(lippen::cli::main_with_args(std::env::args_os()));
}
