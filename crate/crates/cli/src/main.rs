fn main() {
    std::process::exit(seqmine_cli::run(std::env::args_os()));
}
