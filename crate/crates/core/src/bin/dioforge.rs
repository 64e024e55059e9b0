fn main() -> std::process::ExitCode {
    dioforge::cli::main()
}
