//! Bundled scenarios that regenerate the published figures.

pub const FIGURES: [(&str, &str); 7] = [
    ("fig2", include_str!("../scenarios/fig2.toml")),
    ("fig3a", include_str!("../scenarios/fig3a.toml")),
    ("fig3b", include_str!("../scenarios/fig3b.toml")),
    ("fig3c", include_str!("../scenarios/fig3c.toml")),
    ("fig3d", include_str!("../scenarios/fig3d.toml")),
    ("fig4", include_str!("../scenarios/fig4.toml")),
    ("fig5", include_str!("../scenarios/fig5.toml")),
];

pub fn scenario_text(id: &str) -> Option<&'static str> {
    FIGURES.iter().find(|(name, _)| *name == id).map(|(_, text)| *text)
}

pub fn ids() -> impl Iterator<Item = &'static str> {
    FIGURES.iter().map(|(name, _)| *name)
}
