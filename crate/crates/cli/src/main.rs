fn main() {
    std::process::exit(lflab_cli::run(std::env::args_os()));
}
