fn main() {
    std::process::exit(nchull::cli::main_with(std::env::args_os()));
}
