fn main() {
    std::process::exit(cascade_kit::cli::run(std::env::args_os()));
}
