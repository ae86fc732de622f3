fn main() {
    std::process::exit(qcalc_cli::run(std::env::args_os()));
}
