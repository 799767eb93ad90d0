fn main() {
    std::process::exit(explab_cli::run(std::env::args_os().skip(1)));
}
