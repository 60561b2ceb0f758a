fn main() {
    std::process::exit(normlab::cli::run_command(std::env::args_os()));
}
