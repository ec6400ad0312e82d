fn main() {
    std::process::exit(eringen_lab::run(std::env::args()));
}
