fn main() {
    std::process::exit(hqcf::cli::run(std::env::args_os()));
}
