fn main() {
    std::process::exit(qprof::cli::main_with_args(std::env::args_os()));
}
