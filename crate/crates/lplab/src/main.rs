fn main() {
    std::process::exit(lplab::main_with_args(std::env::args_os()));
}
