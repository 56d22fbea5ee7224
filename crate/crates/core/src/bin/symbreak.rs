fn main() {
    std::process::exit(symbreak_core::cli::main());
}
