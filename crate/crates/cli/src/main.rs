fn main() {
    std::process::exit(fragmap_cli::run(std::env::args_os()));
}
