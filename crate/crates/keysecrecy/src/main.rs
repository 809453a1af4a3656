fn main() {
    std::process::exit(keysecrecy::cli::run(std::env::args_os()));
}
