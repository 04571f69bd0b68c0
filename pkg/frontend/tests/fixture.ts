import type { EventCollection, EventFeature } from '../src/types'

function feature(
  id: number,
  disease: [string, string, string],
  city: [string, string, string],
  coords: [number, number],
  date: string,
  links: string[],
): EventFeature {
  return {
    type: 'Feature',
    geometry: { type: 'Point', coordinates: coords },
    properties: {
      event_id: id,
      disease_id: disease[0],
      disease_urdu: disease[1],
      disease_english: disease[2],
      city_id: city[0],
      city_urdu: city[1],
      city_english: city[2],
      event_date: date,
      links,
      item_refs: links.map((_, i) => `ref-${id}-${i}`),
      detected_at: `${date}T12:00:00+00:00`,
    },
  }
}

/** Mirrors the backend's 12-item end-to-end fixture after processing:
 * 5 events, the dengue/Lahore one carrying two merged source links. */
export function fixtureCollection(): EventCollection {
  return {
    type: 'FeatureCollection',
    features: [
      feature(1, ['dengue', 'ڈینگی', 'Dengue'], ['lahore', 'لاہور', 'Lahore'],
        [74.3587, 31.5204], '2026-08-19',
        ['https://a.test/1', 'https://b.test/2']),
      feature(2, ['cholera', 'ہیضہ', 'Cholera'], ['karachi', 'کراچی', 'Karachi'],
        [67.0011, 24.8607], '2026-08-19', ['https://a.test/2']),
      feature(3, ['measles', 'خسرہ', 'Measles'], ['peshawar', 'پشاور', 'Peshawar'],
        [71.5249, 34.0151], '2026-08-19', ['https://a.test/3']),
      feature(4, ['malaria', 'ملیریا', 'Malaria'], ['multan', 'ملتان', 'Multan'],
        [71.4697, 30.1575], '2026-08-19', ['https://a.test/4']),
      feature(5, ['polio', 'پولیو', 'Polio'], ['sukkur', 'سکھر', 'Sukkur'],
        [68.822, 27.7052], '2026-08-19', ['https://a.test/5']),
    ],
  }
}
