fn main() {
    std::process::exit(dltrail::cli::run(std::env::args_os()));
}
