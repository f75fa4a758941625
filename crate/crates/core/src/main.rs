fn main() {
    std::process::exit(seqprove::cli::dispatch(std::env::args_os()));
}
