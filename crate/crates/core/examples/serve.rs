//! The HTTP service: registers both fixtures, answers one query over a
//! real socket and shuts down.
//!
//! ```text
//! cargo run --example serve
//! ```

use std::io::{Read, Write};
use std::sync::Arc;

use skiql::fixtures::{userprofile_aggregate, userprofile_graph};
use skiql::service::{router, serve, Registry};

#[tokio::main]
async fn main() -> std::io::Result<()> {
    let registry = Arc::new(Registry::new());
    let id = registry.register(userprofile_aggregate()).expect("fresh registry");
    registry.register(userprofile_graph()).expect("fresh registry");

    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await?;
    let addr = listener.local_addr()?;
    println!("listening on http://{addr}");
    let (stop, stopped) = tokio::sync::oneshot::channel::<()>();
    let server = tokio::spawn(serve(listener, router(registry, None), async {
        let _ = stopped.await;
    }));

    let response = tokio::task::spawn_blocking(move || -> std::io::Result<String> {
        let body = r#"{"query":"FROM User TO Address","format":"table"}"#;
        let mut stream = std::net::TcpStream::connect(addr)?;
        write!(
            stream,
            "POST /schemas/{id}/query HTTP/1.1\r\nHost: {addr}\r\nContent-Type: application/json\r\n\
             Content-Length: {}\r\nConnection: close\r\n\r\n{body}",
            body.len()
        )?;
        let mut text = String::new();
        stream.read_to_string(&mut text)?;
        Ok(text)
    })
    .await
    .expect("client thread")?;
    println!("{response}");

    stop.send(()).ok();
    server.await.expect("server task")
}
