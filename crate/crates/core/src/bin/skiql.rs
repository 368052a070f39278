fn main() {
    std::process::exit(skiql::cli::main());
}
