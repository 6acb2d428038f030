fn main() {
    std::process::exit(kinvid::cli::run(std::env::args_os()));
}
