fn main() {
    std::process::exit(hodgeset::run(std::env::args_os()));
}
