fn main() {
    std::process::exit(ptpainleve_cli::run(std::env::args_os()));
}
