fn main() {
    std::process::exit(codedopt::cli::main_with_args(std::env::args_os()));
}
