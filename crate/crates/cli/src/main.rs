fn main() {
    std::process::exit(wpline_cli::run(std::env::args_os()));
}
