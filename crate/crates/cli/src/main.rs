fn main() {
    std::process::exit(isoprod_cli::run(std::env::args_os()));
}
