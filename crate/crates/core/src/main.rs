fn main() {
    std::process::exit(trigshear::cli::run(std::env::args_os()));
}
