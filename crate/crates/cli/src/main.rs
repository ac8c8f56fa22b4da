fn main() {
    std::process::exit(oclab_cli::run(std::env::args_os()));
}
