fn main() {
    std::process::exit(mdsfe_core::cli::main_with(std::env::args_os()));
}
