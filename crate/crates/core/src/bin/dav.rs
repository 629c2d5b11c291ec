fn main() {
    std::process::exit(dav::cli::run(std::env::args_os()));
}
