fn main() {
    std::process::exit(chromabound::cli::run(std::env::args_os()));
}
