fn main() {
    std::process::exit(noisecrypt::cli::run(std::env::args_os()));
}
