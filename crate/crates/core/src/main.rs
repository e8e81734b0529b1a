fn main() {
    std::process::exit(detsieve::cli::cli_dispatch(std::env::args_os()));
}
