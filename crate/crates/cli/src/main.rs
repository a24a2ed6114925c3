fn main() {
    std::process::exit(wickstar_cli::app::run(std::env::args_os()));
}
