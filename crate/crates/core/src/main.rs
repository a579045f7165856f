fn main() {
    std::process::exit(oscphase::cli::main_with_args(std::env::args_os()));
}
