fn main() -> std::process::ExitCode {
    weylconv::cli::main()
}
