fn main() {
    std::process::exit(keymine::cli::main());
}
