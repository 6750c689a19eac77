fn main() {
    std::process::exit(dps_infogeo::cli::run(std::env::args_os()));
}
