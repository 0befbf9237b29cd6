fn main() {
    std::process::exit(pisom_cli::main_with_args(std::env::args_os()));
}
