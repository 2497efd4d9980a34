fn main() {
    std::process::exit(rootcert_cli::main_from_env());
}
