fn main() {
    std::process::exit(potts_rsos::cli::main_with_args(std::env::args_os()));
}
