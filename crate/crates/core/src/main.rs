fn main() {
    std::process::exit(asymclust::cli::cli_main(std::env::args_os()));
}
