fn main() {
    std::process::exit(mvgarch_cpd::cli::run(std::env::args_os()));
}
