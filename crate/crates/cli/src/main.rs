fn main() {
    std::process::exit(ppf_cli::main_with_args(std::env::args_os()));
}
