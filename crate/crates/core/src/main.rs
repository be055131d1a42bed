fn main() {
    std::process::exit(blowup_lab::cli::run_command(std::env::args_os()));
}
