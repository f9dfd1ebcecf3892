fn main() -> std::process::ExitCode {
    covert_relay::expcli::cli::main()
}
