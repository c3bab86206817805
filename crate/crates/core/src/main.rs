fn main() {
    std::process::exit(ridgeforge::cli::run(std::env::args_os()));
}
