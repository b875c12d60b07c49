fn main() {
    std::process::exit(cliffstring_cli::run(std::env::args_os()));
}
