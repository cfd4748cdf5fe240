fn main() {
    std::process::exit(csrs::cli::main());
}
