fn main() {
    std::process::exit(geninv::cli::run(std::env::args_os()));
}
