fn main() {
    std::process::exit(tropical_lg::run())
}
