fn main() {
    std::process::exit(effect_algebra::cli::main_with(std::env::args_os()));
}
