fn main() {
    std::process::exit(tempent::cli::run(std::env::args_os()));
}
