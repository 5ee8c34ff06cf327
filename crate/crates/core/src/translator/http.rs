use serde::{Deserialize, Serialize};

use super::{ChatMessage, ChatRequest, RequestError, Translator, TranslatorConfig};

#[derive(Serialize)]
struct CompletionRequest<'a> {
    model: &'a str,
    temperature: f64,
    messages: &'a [ChatMessage],
}

#[derive(Deserialize)]
struct CompletionResponse {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: ResponseMessage,
}

#[derive(Deserialize)]
struct ResponseMessage {
    #[serde(default)]
    content: Option<String>,
}

/// Client for an OpenAI-style `chat/completions` endpoint.
pub struct HttpTranslator {
    client: reqwest::blocking::Client,
    endpoint: String,
    model: String,
    api_key: String,
}

impl HttpTranslator {
    /// Reads the API key from the environment variable named in `cfg`.
    /// Fails with [`RequestError::Auth`] before any request if it is unset.
    pub fn from_config(cfg: &TranslatorConfig) -> Result<Self, RequestError> {
        let key = std::env::var(&cfg.api_key_env)
            .ok()
            .filter(|k| !k.trim().is_empty())
            .ok_or_else(|| RequestError::Auth(format!("environment variable {} is not set", cfg.api_key_env)))?;
        HttpTranslator::with_api_key(cfg, key)
    }

    pub fn with_api_key(cfg: &TranslatorConfig, api_key: String) -> Result<Self, RequestError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(cfg.timeout())
            .build()
            .map_err(|e| RequestError::Transport {
                attempts: 0,
                detail: e.to_string(),
            })?;
        Ok(HttpTranslator {
            client,
            endpoint: cfg.endpoint.clone(),
            model: cfg.model.clone(),
            api_key,
        })
    }
}

impl Translator for HttpTranslator {
    fn model_name(&self) -> &str {
        &self.model
    }

    fn complete(&self, request: &ChatRequest) -> Result<String, RequestError> {
        let body = CompletionRequest {
            model: &self.model,
            temperature: request.temperature,
            messages: &request.messages,
        };
        let transport = |detail: String| RequestError::Transport { attempts: 1, detail };
        let resp = self
            .client
            .post(&self.endpoint)
            .bearer_auth(&self.api_key)
            .json(&body)
            .send()
            .map_err(|e| {
                if e.is_timeout() {
                    RequestError::Timeout { attempts: 1 }
                } else {
                    transport(e.to_string())
                }
            })?;
        let status = resp.status();
        if status == reqwest::StatusCode::UNAUTHORIZED || status == reqwest::StatusCode::FORBIDDEN {
            return Err(RequestError::Auth(format!("HTTP {status}")));
        }
        let text = resp.text().map_err(|e| transport(e.to_string()))?;
        if !status.is_success() {
            let excerpt: String = text.chars().take(200).collect();
            return Err(transport(format!("HTTP {status}: {excerpt}")));
        }
        let parsed: CompletionResponse =
            serde_json::from_str(&text).map_err(|e| transport(format!("malformed response: {e}")))?;
        parsed
            .choices
            .into_iter()
            .next()
            .and_then(|c| c.message.content)
            .ok_or_else(|| transport("response has no choices[0].message.content".into()))
    }
}
