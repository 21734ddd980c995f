fn main() {
    std::process::exit(finq::cli::main_with_args(std::env::args_os()));
}
