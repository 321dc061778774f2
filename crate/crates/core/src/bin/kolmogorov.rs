fn main() {
    std::process::exit(kolmogorov::cli::main_from_env());
}
