use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::fincat::{Arr, CatViolation, FinCat, Obj};

/// Assembles a [`FinCat`] from keyed constituent data.
///
/// Objects and arrows are sorted by their keys before ids are assigned, so
/// every construction that goes through the builder produces deterministic,
/// diffable output regardless of insertion order.
pub struct CatBuilder<OK: Ord + Clone, AK: Ord + Clone> {
    objects: BTreeSet<OK>,
    arrows: BTreeMap<AK, (OK, OK)>,
    identities: BTreeMap<OK, AK>,
}

pub struct BuiltCat<OK: Ord + Clone, AK: Ord + Clone> {
    pub cat: Arc<FinCat>,
    pub obj_ix: BTreeMap<OK, Obj>,
    pub arr_ix: BTreeMap<AK, Arr>,
    pub obj_key: Vec<OK>,
    pub arr_key: Vec<AK>,
}

impl<OK: Ord + Clone, AK: Ord + Clone> Default for CatBuilder<OK, AK> {
    fn default() -> Self {
        CatBuilder { objects: BTreeSet::new(), arrows: BTreeMap::new(), identities: BTreeMap::new() }
    }
}

impl<OK: Ord + Clone, AK: Ord + Clone> CatBuilder<OK, AK> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_object(&mut self, k: OK) {
        self.objects.insert(k);
    }

    pub fn add_arrow(&mut self, k: AK, dom: OK, cod: OK) {
        self.arrows.insert(k, (dom, cod));
    }

    pub fn set_identity(&mut self, o: OK, a: AK) {
        self.identities.insert(o, a);
    }

    /// Finishes the category. `compose` is consulted for every composable
    /// pair of arrow keys and must return a key added via `add_arrow`.
    pub fn build(
        self,
        compose: impl Fn(&AK, &AK) -> AK,
    ) -> Result<BuiltCat<OK, AK>, Vec<CatViolation>> {
        let obj_key: Vec<OK> = self.objects.iter().cloned().collect();
        let obj_ix: BTreeMap<OK, Obj> =
            obj_key.iter().enumerate().map(|(i, k)| (k.clone(), Obj(i))).collect();
        // Arrow ids ordered by (dom key, cod key, arrow key).
        let mut arr_sorted: Vec<(&AK, &(OK, OK))> = self.arrows.iter().collect();
        arr_sorted.sort_by(|a, b| (&a.1 .0, &a.1 .1, a.0).cmp(&(&b.1 .0, &b.1 .1, b.0)));
        let arr_key: Vec<AK> = arr_sorted.iter().map(|(k, _)| (*k).clone()).collect();
        let arr_ix: BTreeMap<AK, Arr> =
            arr_key.iter().enumerate().map(|(i, k)| (k.clone(), Arr(i))).collect();

        let mut dom = Vec::with_capacity(arr_key.len());
        let mut cod = Vec::with_capacity(arr_key.len());
        for (_, (d, c)) in &arr_sorted {
            dom.push(obj_ix[d]);
            cod.push(obj_ix[c]);
        }
        let mut identity = vec![Arr(usize::MAX); obj_key.len()];
        for (o, a) in &self.identities {
            identity[obj_ix[o].0] = arr_ix[a];
        }
        let mut entries = Vec::new();
        for (gi, (gk, (gd, _))) in arr_sorted.iter().enumerate() {
            for (fi, (fk, (_, fc))) in arr_sorted.iter().enumerate() {
                if *gd == *fc {
                    let gfk = compose(gk, fk);
                    let gf = *arr_ix
                        .get(&gfk)
                        .unwrap_or_else(|| panic!("composite of arrows {gi} and {fi} was never added"));
                    entries.push(((Arr(gi), Arr(fi)), gf));
                }
            }
        }
        let cat = FinCat::from_parts(obj_key.len(), dom, cod, identity, &entries)?;
        Ok(BuiltCat { cat: Arc::new(cat), obj_ix, arr_ix, obj_key, arr_key })
    }
}
