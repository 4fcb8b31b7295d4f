fn main() {
    std::process::exit(ordeval::cli::main_entry());
}
