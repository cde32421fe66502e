fn main() {
    std::process::exit(gysin::cli::main());
}
