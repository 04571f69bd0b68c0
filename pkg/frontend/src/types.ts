export type EventProperties = {
  event_id: number
  disease_id: string
  disease_urdu: string | null
  disease_english: string | null
  city_id: string
  city_urdu: string | null
  city_english: string | null
  event_date: string
  links: string[]
  item_refs: string[]
  detected_at: string
}

export type EventFeature = {
  type: 'Feature'
  geometry: { type: 'Point'; coordinates: [number, number] }
  properties: EventProperties
}

export type EventCollection = {
  type: 'FeatureCollection'
  features: EventFeature[]
}

export type DiseaseOption = {
  disease_id: string
  urdu: string
  english: string
}
