fn main() {
    std::process::exit(sssst::cli::run(std::env::args_os()));
}
