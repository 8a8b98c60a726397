fn main() {
    std::process::exit(dualmat_cli::run(std::env::args_os()));
}
