use anyhow::{anyhow, bail, Context};
use fanostab_core::tables::Window;
use fanostab_core::weyl::Grassmannian;

pub const DEFAULT_RADIUS: i64 = 10;

/// `G(k,n)` or `P(n)`.
pub fn space(s: &str) -> anyhow::Result<Grassmannian> {
    let s = s.trim();
    let inner = |prefix: char| s.strip_prefix(prefix).and_then(|r| r.strip_prefix('(')).and_then(|r| r.strip_suffix(')'));
    if let Some(n) = inner('P') {
        let n = n.trim().parse().with_context(|| format!("bad dimension in {s}"))?;
        return Grassmannian::projective(n).map_err(|e| anyhow!("{s}: {e}"));
    }
    if let Some(body) = inner('G') {
        let (k, n) = body.split_once(',').ok_or_else(|| anyhow!("expected G(k,n), found {s}"))?;
        let k = k.trim().parse().with_context(|| format!("bad k in {s}"))?;
        let n = n.trim().parse().with_context(|| format!("bad n in {s}"))?;
        return Grassmannian::new(k, n).map_err(|e| anyhow!("{s}: {e}"));
    }
    bail!("expected G(k,n) or P(n), found {s}")
}

/// `a:b`, defaulting to `|t| <= 10`. The flag says whether it was defaulted.
pub fn window(s: Option<&str>) -> anyhow::Result<(Window, bool)> {
    let Some(s) = s else {
        return Ok((Window::symmetric(DEFAULT_RADIUS), true));
    };
    let (a, b) = s.split_once(':').ok_or_else(|| anyhow!("expected a twist range a:b, found {s}"))?;
    let a = a.trim().parse().with_context(|| format!("bad lower twist in {s}"))?;
    let b = b.trim().parse().with_context(|| format!("bad upper twist in {s}"))?;
    Ok((Window::new(a, b).map_err(|e| anyhow!("{e}"))?, false))
}

pub fn window_header(w: Window, defaulted: bool) -> String {
    if defaulted {
        format!("{}:{} (default |t| <= {DEFAULT_RADIUS})", w.min, w.max)
    } else {
        format!("{}:{}", w.min, w.max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spaces() {
        assert_eq!(space("G(1,5)").unwrap(), Grassmannian::new(1, 5).unwrap());
        assert_eq!(space("P(3)").unwrap(), Grassmannian::projective(3).unwrap());
        assert!(space("G(5,5)").is_err());
        assert!(space("Q(3)").is_err());
    }

    #[test]
    fn windows() {
        assert_eq!(window(Some("-2:3")).unwrap().0, Window { min: -2, max: 3 });
        assert_eq!(window(None).unwrap(), (Window::symmetric(10), true));
        assert!(window(Some("3:1")).is_err());
        assert!(window(Some("3")).is_err());
    }
}
