fn main() {
    std::process::exit(metadist::cli::main_with_args(std::env::args_os()));
}
