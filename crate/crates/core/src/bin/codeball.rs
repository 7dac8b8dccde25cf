fn main() {
    std::process::exit(codeball::experiments::main_with_args(std::env::args_os()));
}
