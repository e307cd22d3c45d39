fn main() {
    std::process::exit(asymdl::cli::main());
}
