fn main() {
    std::process::exit(hj_sweep::cli::run_command(std::env::args_os()));
}
