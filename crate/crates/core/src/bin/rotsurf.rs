fn main() {
    std::process::exit(rotsurf::cli::run(std::env::args_os()));
}
