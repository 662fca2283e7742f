fn main() {
    std::process::exit(lzsim::cli::main_with(std::env::args_os()));
}
