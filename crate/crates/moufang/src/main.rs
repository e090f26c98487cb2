fn main() {
    std::process::exit(moufang::cli::run_from_env());
}
