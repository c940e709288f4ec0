fn main() {
    std::process::exit(ngss::cli::run_command(std::env::args_os()));
}
