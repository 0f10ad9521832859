fn main() -> std::process::ExitCode {
    radar::cli::main()
}
