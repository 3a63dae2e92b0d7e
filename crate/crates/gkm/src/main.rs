fn main() {
    std::process::exit(gkm::run(std::env::args_os()));
}
