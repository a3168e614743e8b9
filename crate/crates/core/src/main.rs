fn main() {
    std::process::exit(toric_bordism::cli::main_with_args(std::env::args_os()));
}
