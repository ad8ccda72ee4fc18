fn main() {
    std::process::exit(gapsmith_cli::main_with(std::env::args_os().skip(1)));
}
