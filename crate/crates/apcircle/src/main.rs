fn main() {
    std::process::exit(apcircle::cli::run_main());
}
