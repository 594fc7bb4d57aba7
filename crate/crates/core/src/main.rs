fn main() {
    std::process::exit(hpsg::cli::main());
}
