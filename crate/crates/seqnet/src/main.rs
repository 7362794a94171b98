fn main() {
    std::process::exit(seqnet::cli::main_with(std::env::args_os()));
}
