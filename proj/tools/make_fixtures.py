#!/usr/bin/env python3
"""Regenerates the fixture corpus under data/. Output is deterministic."""

import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent
DATA = ROOT / "data"


def dump_jsonl(path, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=False, separators=(",", ":")) + "\n")


def dump_json(path, obj):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(json.dumps(obj, indent=2) + "\n")


def imagenet(top1, top5):
    return {"dataset": "ImageNet", "accuracy": {"top-1 accuracy": top1, "top-5 accuracy": top5}}


# (id, domain, functionality, api_name, api_call, args, env, example, performance, description, instruction)
TORCH = [
    ("densenet121", "Classification", "Image Classification", "DenseNet-121",
     "torch.hub.load(repo_or_dir='pytorch/vision', model='densenet121', pretrained=True)",
     ["repo_or_dir", "model", "pretrained"], "torch, torchvision",
     "model = torch.hub.load('pytorch/vision', 'densenet121', pretrained=True); model.eval()",
     [imagenet(74.65, 92.17)],
     "Dense Convolutional Network connects each layer to every other layer in a feed-forward fashion, which strengthens feature propagation and reduces parameters.",
     "I am building a photo tagging tool and need a densely connected convolutional network that labels everyday objects."),
    ("resnext101_32x16d_wsl", "Classification", "Image Classification", "ResNeXt-101 32x16d",
     "torch.hub.load(repo_or_dir='facebookresearch/WSL-Images', model='resnext101_32x16d_wsl')",
     ["repo_or_dir", "model"], "torch, torchvision",
     "model = torch.hub.load('facebookresearch/WSL-Images', 'resnext101_32x16d_wsl'); model.eval()",
     [imagenet(84.2, 97.2)],
     "ResNeXt models pre-trained in weakly supervised fashion on 940 million public Instagram images with hashtags and fine-tuned on ImageNet.",
     "Recommend a very accurate classifier pretrained on billions of weakly labeled social media pictures with hashtags."),
    ("mobilenet_v2", "Classification", "Image Classification", "MobileNetV2",
     "torch.hub.load('pytorch/vision', 'mobilenet_v2', pretrained=True)",
     ["repo_or_dir", "model", "pretrained"], "torch, torchvision",
     "model = torch.hub.load('pytorch/vision', 'mobilenet_v2', pretrained=True)",
     [imagenet(71.88, 90.29)],
     "MobileNet v2 uses inverted residual blocks with linear bottlenecks, designed for phones and embedded vision.",
     "My phone app needs a lightweight inverted residual network to recognize what the camera is pointing at."),
    ("hybridnets", "Object Detection", "Traffic Object Detection, Drivable Area Segmentation, Lane Detection", "HybridNets",
     "torch.hub.load(repo_or_dir='datvuthanh/hybridnets', model='hybridnets', pretrained=True)",
     ["repo_or_dir", "model", "pretrained"], "Python>=3.7, PyTorch>=1.10",
     "import torch; model = torch.hub.load('datvuthanh/hybridnets', 'hybridnets', pretrained=True); img = torch.randn(1,3,640,384); features, regression, classification, anchors, segmentation = model(img)",
     {"dataset": [{"name": "BDD100K", "accuracy": {
         "Traffic Object Detection": {"Recall (%)": 92.8, "mAP@0.5 (%)": 77.3},
         "Drivable Area Segmentation": {"Drivable mIoU (%)": 90.5},
         "Lane Line Detection": {"Accuracy (%)": 85.4, "Lane Line IoU (%)": 31.6}}}]},
     "HybridNets is an end2end perception network for multi-tasks. Our work focused on traffic object detection, drivable area segmentation and lane detection. HybridNets can run real-time on embedded systems, and obtains SOTA Object Detection, Lane Detection on BDD100K Dataset.",
     "I am an engineer at Uber and I need to find a API that can classify pedestrians, cars, etc. from an image of the scene."),
    ("resnet50", "Classification", "Image Classification", "ResNet-50",
     "torch.hub.load('pytorch/vision', 'resnet50', pretrained=True)",
     ["repo_or_dir", "model", "pretrained"], "torch, torchvision",
     "model = torch.hub.load('pytorch/vision', 'resnet50', pretrained=True)",
     [imagenet(76.13, 92.86)],
     "Deep residual network with fifty layers that learns residual functions with reference to the layer inputs.",
     "Give me a fifty layer residual network that sorts product photos into categories."),
    ("resnet18", "Classification", "Image Classification", "ResNet-18",
     "torch.hub.load(repo_or_dir='pytorch/vision', model='resnet18', pretrained=True)",
     ["repo_or_dir", "model", "pretrained"], "torch, torchvision",
     "model = torch.hub.load('pytorch/vision', 'resnet18', pretrained=True)",
     [imagenet(69.76, 89.08)],
     "Shallow eighteen layer residual network, a fast baseline for recognition experiments.",
     "I want a small eighteen layer residual baseline for quick experiments on labeling pictures."),
    ("vgg16", "Classification", "Image Classification", "VGG-16",
     "torch.hub.load(repo_or_dir='pytorch/vision', model='vgg16', pretrained=True)",
     ["repo_or_dir", "model", "pretrained"], "torch, torchvision",
     "model = torch.hub.load('pytorch/vision', 'vgg16', pretrained=True)",
     [imagenet(71.59, 90.38)],
     "Very deep convolutional network from the Visual Geometry Group with sixteen weight layers of small 3x3 filters.",
     "Which classic sixteen layer network with tiny 3x3 filters can I use to tell dog breeds apart?"),
    ("alexnet", "Classification", "Image Classification", "AlexNet",
     "torch.hub.load(repo_or_dir='pytorch/vision', model='alexnet', pretrained=True)",
     ["repo_or_dir", "model", "pretrained"], "torch, torchvision",
     "model = torch.hub.load('pytorch/vision', 'alexnet', pretrained=True)",
     [imagenet(56.52, 79.07)],
     "The 2012 winning network that popularized deep learning for vision, with five convolutional layers.",
     "For a history of deep learning lecture, load the 2012 competition winning network and classify a few images."),
    ("googlenet", "Classification", "Image Classification", "GoogLeNet",
     "torch.hub.load(repo_or_dir='pytorch/vision', model='googlenet', pretrained=True)",
     ["repo_or_dir", "model", "pretrained"], "torch, torchvision",
     "model = torch.hub.load('pytorch/vision', 'googlenet', pretrained=True)",
     [imagenet(69.78, 89.53)],
     "Inception v1 network built from stacked inception modules that run parallel convolutions of different sizes.",
     "I need an inception module network (version one) to recognize animals in wildlife camera traps."),
    ("squeezenet1_0", "Classification", "Image Classification", "SqueezeNet",
     "torch.hub.load(repo_or_dir='pytorch/vision', model='squeezenet1_0', pretrained=True)",
     ["repo_or_dir", "model", "pretrained"], "torch, torchvision",
     "model = torch.hub.load('pytorch/vision', 'squeezenet1_0', pretrained=True)",
     [imagenet(58.09, 80.42)],
     "Achieves AlexNet-level accuracy with 50x fewer parameters using fire modules.",
     "Find a tiny model built from fire modules that can classify images on a microcontroller."),
    ("shufflenet_v2_x1_0", "Classification", "Image Classification", "ShuffleNet V2",
     "torch.hub.load(repo_or_dir='pytorch/vision', model='shufflenet_v2_x1_0', pretrained=True)",
     ["repo_or_dir", "model", "pretrained"], "torch, torchvision",
     "model = torch.hub.load('pytorch/vision', 'shufflenet_v2_x1_0', pretrained=True)",
     [imagenet(69.36, 88.32)],
     "Efficient architecture using channel split and channel shuffle operations, optimized for speed on mobile devices.",
     "I need a channel shuffling efficient network for image recognition on a drone."),
    ("wide_resnet50_2", "Classification", "Image Classification", "Wide ResNet-50-2",
     "torch.hub.load(repo_or_dir='pytorch/vision', model='wide_resnet50_2', pretrained=True)",
     ["repo_or_dir", "model", "pretrained"], "torch, torchvision",
     "model = torch.hub.load('pytorch/vision', 'wide_resnet50_2', pretrained=True)",
     [imagenet(78.47, 94.09)],
     "Wide residual network where the bottleneck blocks have twice as many channels.",
     "Suggest a residual network with widened bottleneck channels for sorting satellite tiles."),
    ("deeplabv3_resnet101", "Semantic Segmentation", "Semantic Segmentation", "DeepLabV3",
     "torch.hub.load(repo_or_dir='pytorch/vision', model='deeplabv3_resnet101', pretrained=True)",
     ["repo_or_dir", "model", "pretrained"], "torch, torchvision",
     "model = torch.hub.load('pytorch/vision', 'deeplabv3_resnet101', pretrained=True)",
     [{"dataset": "COCO val2017", "Mean IOU": 67.4, "Global Pixelwise Accuracy": 92.4}],
     "Atrous convolution based segmentation with a ResNet-101 backbone, producing a label for every pixel.",
     "I need to label every pixel of street photos with atrous convolutions so I can mask out roads."),
    ("fcn_resnet50", "Semantic Segmentation", "Semantic Segmentation", "FCN-ResNet50",
     "torch.hub.load(repo_or_dir='pytorch/vision', model='fcn_resnet50', pretrained=True)",
     ["repo_or_dir", "model", "pretrained"], "torch, torchvision",
     "model = torch.hub.load('pytorch/vision', 'fcn_resnet50', pretrained=True)",
     [{"dataset": "COCO val2017", "Mean IOU": 60.5, "Global Pixelwise Accuracy": 91.4}],
     "Fully convolutional network for pixel-level prediction without any dense layers.",
     "Which fully convolutional model can segment people from the background in video calls?"),
    ("yolov5s", "Object Detection", "Object Detection", "YOLOv5s",
     "torch.hub.load('ultralytics/yolov5', 'yolov5s', pretrained=True)",
     ["repo_or_dir", "model", "pretrained"], "torch, opencv-python, pandas",
     "model = torch.hub.load('ultralytics/yolov5', 'yolov5s', pretrained=True); results = model('zidane.jpg')",
     [{"dataset": "COCO", "mAP@0.5:0.95": 37.4, "mAP@0.5": 56.8}],
     "You only look once single-stage detector, small variant, real-time bounding boxes for eighty categories.",
     "Count the number of forklifts and boxes in warehouse CCTV footage in real time with a single-stage detector."),
    ("silero_stt", "Speech-To-Text", "Speech To Text", "Silero STT",
     "torch.hub.load(repo_or_dir='snakers4/silero-models', model='silero_stt', language='en', device='cpu')",
     ["repo_or_dir", "model", "language", "device"], "torch, torchaudio, omegaconf, soundfile",
     "model, decoder, utils = torch.hub.load(repo_or_dir='snakers4/silero-models', model='silero_stt', language='en', device='cpu')",
     [],
     "Enterprise grade pre-trained speech recognition transcribing spoken English, German and Spanish audio into text.",
     "Transcribe my recorded English voice memos into written notes."),
    ("dcgan", "Generative Adversarial Networks", "Generative Adversarial Networks", "DCGAN",
     "torch.hub.load(repo_or_dir='facebookresearch/pytorch_GAN_zoo:hub', model='DCGAN', pretrained=True, useGPU=False)",
     ["repo_or_dir", "model", "pretrained", "useGPU"], "torch, torchvision",
     "model = torch.hub.load('facebookresearch/pytorch_GAN_zoo:hub', 'DCGAN', pretrained=True, useGPU=False); noise, _ = model.buildNoiseData(4)",
     [],
     "Deep convolutional generative adversarial network producing 64x64 synthetic fashion photos from random noise.",
     "Produce a handful of synthetic low resolution clothing pictures from random noise for a mockup."),
    ("midas", "Depth Estimation", "Monocular Depth Estimation", "MiDaS",
     "torch.hub.load(repo_or_dir='intel-isl/MiDaS', model='MiDaS', pretrained=True)",
     ["repo_or_dir", "model", "pretrained"], "torch, timm",
     "midas = torch.hub.load('intel-isl/MiDaS', 'MiDaS'); midas.eval()",
     [],
     "Computes relative inverse depth from a single image, trained on a mixture of ten datasets.",
     "Estimate how far away things are from a single photograph for a robot vacuum."),
    ("nvidia_tacotron2", "Text-to-Speech", "Text-to-Speech", "Tacotron 2",
     "torch.hub.load(repo_or_dir='NVIDIA/DeepLearningExamples:torchhub', model='nvidia_tacotron2', model_math='fp16')",
     ["repo_or_dir", "model", "model_math"], "torch, numpy, scipy, librosa, unidecode, inflect",
     "tacotron2 = torch.hub.load('NVIDIA/DeepLearningExamples:torchhub', 'nvidia_tacotron2', model_math='fp16')",
     [],
     "Generates mel spectrograms from input text with an encoder-decoder and attention, paired with a WaveGlow vocoder for natural sounding speech.",
     "Read my bedtime story text aloud in a natural synthetic voice."),
    ("nvidia_ssd", "Object Detection", "Object Detection", "SSD300",
     "torch.hub.load(repo_or_dir='NVIDIA/DeepLearningExamples:torchhub', model='nvidia_ssd')",
     ["repo_or_dir", "model"], "torch, numpy, scipy, scikit-image, matplotlib",
     "ssd_model = torch.hub.load('NVIDIA/DeepLearningExamples:torchhub', 'nvidia_ssd')",
     [{"dataset": "COCO", "mAP": 25.0}],
     "Single Shot MultiBox Detector at 300x300 input, discretizing bounding box outputs into default boxes.",
     "Detect and box every bicycle in a parking lot image with a multibox detector at 300 pixel resolution."),
]

TF = [
    ("mobilenet_v2_100_224_classification", "image-classification", "Image classification", "imagenet-mobilenet_v2_100_224-classification",
     "hub.KerasLayer('https://tfhub.dev/google/imagenet/mobilenet_v2_100_224/classification/4')",
     ["handle", "trainable"], "tensorflow, tensorflow-hub",
     "model = tf.keras.Sequential([hub.KerasLayer('https://tfhub.dev/google/imagenet/mobilenet_v2_100_224/classification/4')])",
     [{"dataset": "ImageNet", "accuracy": 0.718}],
     "Keras layer predicting 1001 classes from 224x224 inputs with a depth multiplier of 1.0.",
     "Label the contents of photos uploaded to my online marketplace with a compact 224 pixel classifier."),
    ("mobilenet_v2_100_224_feature_vector", "image-feature-vector", "Feature extraction", "imagenet-mobilenet_v2_100_224-feature_vector",
     "hub.KerasLayer('https://tfhub.dev/google/imagenet/mobilenet_v2_100_224/feature_vector/4', trainable=False)",
     ["handle", "trainable"], "tensorflow, tensorflow-hub",
     "layer = hub.KerasLayer('https://tfhub.dev/google/imagenet/mobilenet_v2_100_224/feature_vector/4', trainable=False)",
     [{"dataset": "ImageNet", "accuracy": 71.9}],
     "Headless network that outputs 1280-dimensional feature vectors for transfer learning.",
     "Extract compact feature vectors from flower pictures so I can train my own small head on top."),
    ("inception_v3_classification", "image-classification", "Image classification", "imagenet-inception_v3-classification",
     "hub.KerasLayer(handle='https://tfhub.dev/google/imagenet/inception_v3/classification/5')",
     ["handle"], "tensorflow, tensorflow-hub",
     "model = tf.keras.Sequential([hub.KerasLayer(handle='https://tfhub.dev/google/imagenet/inception_v3/classification/5')])",
     [{"dataset": "ImageNet", "accuracy": 77.9}],
     "Third generation inception architecture with factorized convolutions, expects 299x299 inputs.",
     "Identify the species in 299 pixel bird photos using factorized convolutions."),
    ("efficientnet_b0_classification", "image-classification", "Image classification", "efficientnet-b0-classification",
     "hub.KerasLayer('https://tfhub.dev/tensorflow/efficientnet/b0/classification/1')",
     ["handle"], "tensorflow, tensorflow-hub",
     "m = tf.keras.Sequential([hub.KerasLayer('https://tfhub.dev/tensorflow/efficientnet/b0/classification/1')])",
     [{"dataset": "ImageNet", "accuracy": 77.1}],
     "Compound scaled convolutional baseline that balances depth, width and resolution.",
     "Classify recycling items from a conveyor camera with a compound scaled baseline network."),
    ("universal_sentence_encoder", "text-embedding", "Embedding text", "universal-sentence-encoder",
     "hub.load('https://tfhub.dev/google/universal-sentence-encoder/4')",
     ["handle"], "tensorflow, tensorflow-hub",
     "embed = hub.load('https://tfhub.dev/google/universal-sentence-encoder/4'); embeddings = embed(['Hello world'])",
     [{"dataset": "STS benchmark", "Pearson correlation": 0.803}],
     "Encodes sentences into 512-dimensional vectors for semantic similarity, clustering and classification.",
     "Turn customer reviews into 512 dimensional vectors so I can find near-duplicate complaints."),
    ("ssd_mobilenet_v2_openimages", "image-object-detection", "Detect objects in images", "openimages_v4-ssd-mobilenet_v2",
     "hub.load('https://tfhub.dev/google/openimages_v4/ssd/mobilenet_v2/1')",
     ["handle"], "tensorflow, tensorflow-hub",
     "detector = hub.load('https://tfhub.dev/google/openimages_v4/ssd/mobilenet_v2/1'); result = detector(image)",
     [{"dataset": "Open Images v4", "mAP": 0.34}],
     "Single shot detector on a mobile backbone trained on Open Images v4 with 600 boxable categories.",
     "I am working on a project to detect objects in images taken from drones and want a fast detector trained on 600 boxable categories."),
    ("faster_rcnn_inception_resnet_v2_openimages", "image-object-detection", "Detect objects in images", "faster_rcnn-openimages_v4-inception_resnet_v2",
     "hub.load('https://tfhub.dev/google/faster_rcnn/openimages_v4/inception_resnet_v2/1')",
     ["handle"], "tensorflow, tensorflow-hub",
     "detector = hub.load('https://tfhub.dev/google/faster_rcnn/openimages_v4/inception_resnet_v2/1')",
     [{"dataset": "Open Images v4", "mAP": 0.58}],
     "Two-stage region proposal detector with an Inception-ResNet backbone, slower but more precise.",
     "I need a precise two-stage region proposal detector for auditing shelf inventory photos, speed is not important."),
    ("arbitrary_image_stylization", "image-style-transfer", "Image style transfer", "magenta-arbitrary-image-stylization-v1-256",
     "hub.load('https://tfhub.dev/google/magenta/arbitrary-image-stylization-v1-256/2')",
     ["handle"], "tensorflow, tensorflow-hub",
     "stylize = hub.load('https://tfhub.dev/google/magenta/arbitrary-image-stylization-v1-256/2'); out = stylize(tf.constant(content), tf.constant(style))[0]",
     [],
     "Fast arbitrary artistic style transfer that repaints a content picture in the style of any painting.",
     "Repaint my holiday snapshot so it looks like a Van Gogh painting."),
    ("spice", "audio-pitch-extraction", "Pitch extraction", "spice",
     "hub.load('https://tfhub.dev/google/spice/2')",
     ["handle"], "tensorflow, tensorflow-hub",
     "model = hub.load('https://tfhub.dev/google/spice/2'); output = model.signatures['serving_default'](tf.constant(audio, tf.float32))",
     [],
     "Self-supervised pitch estimation returning pitch and uncertainty for each frame of mono 16kHz audio.",
     "Track the melody of a singer over time from a 16kHz recording."),
    ("yamnet", "audio-event-classification", "Audio event classification", "yamnet",
     "hub.load('https://tfhub.dev/google/yamnet/1')",
     ["handle"], "tensorflow, tensorflow-hub",
     "model = hub.load('https://tfhub.dev/google/yamnet/1'); scores, embeddings, spectrogram = model(waveform)",
     [{"dataset": "AudioSet", "mAP": 0.306}],
     "Predicts 521 AudioSet sound event classes such as laughter, barking or sirens from waveforms.",
     "Alert me when the microphone hears a dog barking or a siren."),
    ("bert_en_uncased", "text-language-model", "Language model", "bert_en_uncased_L-12_H-768_A-12",
     "hub.KerasLayer('https://tfhub.dev/tensorflow/bert_en_uncased_L-12_H-768_A-12/4', trainable=True)",
     ["handle", "trainable"], "tensorflow, tensorflow-hub, tensorflow-text",
     "encoder = hub.KerasLayer('https://tfhub.dev/tensorflow/bert_en_uncased_L-12_H-768_A-12/4', trainable=True)",
     [{"dataset": "GLUE", "average score": 79.6}],
     "Bidirectional transformer encoder with 12 layers and 768 hidden units, lowercased English vocabulary.",
     "Fine-tune a twelve layer bidirectional transformer encoder on my support ticket routing data."),
    ("nnlm_en_dim128", "text-embedding", "Embedding text", "nnlm-en-dim128",
     "hub.KerasLayer('https://tfhub.dev/google/nnlm-en-dim128/2', input_shape=[], dtype=tf.string)",
     ["handle", "input_shape", "dtype"], "tensorflow, tensorflow-hub",
     "layer = hub.KerasLayer('https://tfhub.dev/google/nnlm-en-dim128/2', input_shape=[], dtype=tf.string)",
     [],
     "Token based neural network language model trained on English Google News, 128 dimensional output.",
     "Map movie titles into 128 dimensional vectors trained on news text for a recommendation prototype."),
    ("resnet_50_classification", "image-classification", "Image classification", "imagenet-resnet_50-classification",
     "hub.KerasLayer('https://tfhub.dev/tensorflow/resnet_50/classification/1')",
     ["handle"], "tensorflow, tensorflow-hub",
     "m = tf.keras.Sequential([hub.KerasLayer('https://tfhub.dev/tensorflow/resnet_50/classification/1')])",
     [{"dataset": "ImageNet", "accuracy": 75.3}],
     "Residual network v1.5 with fifty layers as a Keras layer producing ImageNet logits.",
     "Tag vacation photos with a Keras residual network of version 1.5."),
    ("movenet_singlepose_lightning", "image-pose-detection", "Pose detection", "movenet-singlepose-lightning",
     "hub.load('https://tfhub.dev/google/movenet/singlepose/lightning/4')",
     ["handle"], "tensorflow, tensorflow-hub",
     "model = hub.load('https://tfhub.dev/google/movenet/singlepose/lightning/4'); movenet = model.signatures['serving_default']",
     [],
     "Ultra fast model that detects 17 body keypoints of a single person, tuned for latency critical fitness apps.",
     "Find the elbows, knees and shoulders of one person doing squats in my fitness app."),
    ("esrgan", "image-super-resolution", "Image super resolution", "esrgan-tf2",
     "hub.load('https://tfhub.dev/captain-pool/esrgan-tf2/1')",
     ["handle"], "tensorflow, tensorflow-hub",
     "model = hub.load('https://tfhub.dev/captain-pool/esrgan-tf2/1'); sr = model(low_res)",
     [],
     "Enhanced super resolution generative adversarial network that upscales images by four times.",
     "Upscale blurry old family scans to four times their resolution."),
]

HF = [
    ("intel_dpt_large", "Computer Vision Depth Estimation", "Depth Estimation", "Intel/dpt-large",
     "pipeline('depth-estimation', model='Intel/dpt-large')",
     ["task", "model"], "transformers, torch",
     "depth = pipeline('depth-estimation', model='Intel/dpt-large'); result = depth(image)",
     [{"dataset": "MIX 6", "Zero-shot transfer": 10.82}],
     "Dense prediction transformer trained on 1.4 million images for monocular depth estimation.",
     "Build a feature that guesses scene depth from a single phone photo using a dense prediction transformer."),
    ("vilt_vqa", "Multimodal Visual Question Answering", "Visual Question Answering", "dandelin/vilt-b32-finetuned-vqa",
     "pipeline('visual-question-answering', model='dandelin/vilt-b32-finetuned-vqa')",
     ["task", "model"], "transformers, torch",
     "vqa = pipeline('visual-question-answering', model='dandelin/vilt-b32-finetuned-vqa'); vqa(image=img, question='How many cats?')",
     [{"dataset": "VQAv2", "accuracy": 71.26}],
     "Vision-and-language transformer without convolution or region supervision, fine-tuned to answer questions about pictures.",
     "Answer free-form questions like 'how many cats are on the sofa' about an uploaded picture."),
    ("sst2_distilbert", "Natural Language Processing Text Classification", "Sentiment Analysis", "distilbert-base-uncased-finetuned-sst-2-english",
     "pipeline('text-classification', model='distilbert-base-uncased-finetuned-sst-2-english')",
     ["task", "model"], "transformers",
     "clf = pipeline('text-classification', model='distilbert-base-uncased-finetuned-sst-2-english'); clf('I love this!')",
     [{"dataset": "glue sst2", "accuracy": 91.3}],
     "Distilled encoder fine-tuned on the Stanford Sentiment Treebank to label movie review sentences positive or negative.",
     "Flag negative product reviews automatically so support can respond first."),
    ("bart_large_cnn", "Natural Language Processing Summarization", "Summarization", "facebook/bart-large-cnn",
     "pipeline('summarization', model='facebook/bart-large-cnn')",
     ["task", "model"], "transformers",
     "summarizer = pipeline('summarization', model='facebook/bart-large-cnn'); summarizer(article, max_length=130)",
     [{"dataset": "cnn_dailymail", "ROUGE-1": 42.95}],
     "Denoising sequence-to-sequence pretrained transformer fine-tuned on CNN Daily Mail news articles.",
     "Condense long news articles into a three sentence digest for my newsletter."),
    ("vits_ljspeech", "Audio Text-to-Speech", "Text-to-Speech", "espnet/kan-bayashi_ljspeech_vits",
     "pipeline('text-to-speech', model='espnet/kan-bayashi_ljspeech_vits')",
     ["task", "model"], "transformers, espnet",
     "tts = pipeline('text-to-speech', model='espnet/kan-bayashi_ljspeech_vits'); audio = tts('Hello')",
     [],
     "Variational inference end-to-end speech synthesis trained on the LJ Speech single speaker corpus.",
     "Narrate my blog posts in a single female English speaker voice."),
    ("whisper_small", "Audio Automatic Speech Recognition", "Speech Recognition", "openai/whisper-small",
     "pipeline('automatic-speech-recognition', model='openai/whisper-small')",
     ["task", "model"], "transformers, torchaudio",
     "asr = pipeline('automatic-speech-recognition', model='openai/whisper-small'); asr('meeting.flac')",
     [{"dataset": "LibriSpeech test-clean", "WER": 3.43}],
     "Weakly supervised multilingual speech recognizer trained on 680k hours of labelled audio.",
     "Create subtitles for my multilingual podcast episodes."),
    ("bart_large_mnli", "Natural Language Processing Zero-Shot Classification", "Zero-Shot Classification", "facebook/bart-large-mnli",
     "pipeline('zero-shot-classification', model='facebook/bart-large-mnli')",
     ["task", "model"], "transformers",
     "clf = pipeline('zero-shot-classification', model='facebook/bart-large-mnli'); clf(text, candidate_labels=['sports', 'politics'])",
     [{"dataset": "MNLI", "accuracy": 89.9}],
     "Natural language inference model that scores arbitrary candidate labels without task specific training.",
     "Sort incoming emails into labels I make up on the fly, without training anything."),
    ("bert_base_uncased", "Natural Language Processing Fill-Mask", "Feature Extraction", "bert-base-uncased",
     "AutoModel.from_pretrained('bert-base-uncased')",
     ["pretrained_model_name_or_path"], "transformers",
     "model = AutoModel.from_pretrained('bert-base-uncased'); tokenizer = AutoTokenizer.from_pretrained('bert-base-uncased')",
     [{"dataset": "GLUE", "average": 79.6}],
     "Masked language modeling pretrained English encoder, lowercased, base size.",
     "Get contextual token representations of lowercased English sentences for a downstream tagger."),
    ("twitter_roberta_sentiment", "Natural Language Processing Text Classification", "Sentiment Analysis", "cardiffnlp/twitter-roberta-base-sentiment",
     "AutoModelForSequenceClassification.from_pretrained('cardiffnlp/twitter-roberta-base-sentiment')",
     ["pretrained_model_name_or_path"], "transformers",
     "model = AutoModelForSequenceClassification.from_pretrained('cardiffnlp/twitter-roberta-base-sentiment')",
     [{"dataset": "TweetEval", "macro recall": 72.9}],
     "Robustly optimized encoder trained on about 58M tweets and fine-tuned for three-way sentiment.",
     "Measure whether tweets about our brand are positive, neutral or negative."),
    ("gpt2", "Natural Language Processing Text Generation", "Text Generation", "gpt2",
     "AutoModelForCausalLM.from_pretrained('gpt2')",
     ["pretrained_model_name_or_path"], "transformers",
     "model = AutoModelForCausalLM.from_pretrained('gpt2'); tokenizer = AutoTokenizer.from_pretrained('gpt2')",
     [{"dataset": "WikiText-103", "perplexity": 37.5}],
     "Causal transformer language model trained on WebText to continue a prompt one token at a time.",
     "Autocomplete the next few sentences of a story draft."),
    ("vit_base_patch16_224", "Computer Vision Image Classification", "Image Classification", "google/vit-base-patch16-224",
     "AutoModelForImageClassification.from_pretrained('google/vit-base-patch16-224')",
     ["pretrained_model_name_or_path"], "transformers, torch",
     "model = AutoModelForImageClassification.from_pretrained('google/vit-base-patch16-224')",
     [{"dataset": "ImageNet", "top-1 accuracy": 81.1}],
     "Vision transformer splitting images into 16x16 patches, pretrained on ImageNet-21k and fine-tuned at 224.",
     "Classify artwork photos by splitting them into 16x16 patches with a transformer."),
    ("detr_resnet50", "Computer Vision Object Detection", "Object Detection", "facebook/detr-resnet-50",
     "DetrForObjectDetection.from_pretrained('facebook/detr-resnet-50')",
     ["pretrained_model_name_or_path"], "transformers, torch, timm",
     "model = DetrForObjectDetection.from_pretrained('facebook/detr-resnet-50')",
     [{"dataset": "COCO 2017 validation", "AP": 42.0}],
     "End-to-end detection transformer with set-based bipartite matching loss and a ResNet-50 backbone.",
     "Find bounding boxes of all kitchen utensils in a photo using set prediction with bipartite matching."),
    ("t5_small", "Natural Language Processing Translation", "Translation", "t5-small",
     "T5ForConditionalGeneration.from_pretrained('t5-small')",
     ["pretrained_model_name_or_path"], "transformers, sentencepiece",
     "model = T5ForConditionalGeneration.from_pretrained('t5-small')",
     [],
     "Text-to-text transfer transformer, small size, that casts translation and other tasks as text generation.",
     "Translate short English product descriptions to German with a small text-to-text model."),
    ("bert_base_ner", "Natural Language Processing Token Classification", "Named Entity Recognition", "dslim/bert-base-NER",
     "AutoModelForTokenClassification.from_pretrained('dslim/bert-base-NER')",
     ["pretrained_model_name_or_path"], "transformers",
     "model = AutoModelForTokenClassification.from_pretrained('dslim/bert-base-NER')",
     [{"dataset": "conll2003", "f1": 91.3}],
     "Token classifier recognizing persons, organizations, locations and miscellaneous entities, fine-tuned on CoNLL-2003.",
     "Highlight names of people, companies and cities in legal contracts."),
    ("clip_vit_base_patch32", "Computer Vision Zero-Shor Image Classification", "Zero-Shot Image Classification", "openai/clip-vit-base-patch32",
     "CLIPModel.from_pretrained('openai/clip-vit-base-patch32')",
     ["pretrained_model_name_or_path"], "transformers, torch",
     "model = CLIPModel.from_pretrained('openai/clip-vit-base-patch32')",
     [{"dataset": "ImageNet zero-shot", "top-1 accuracy": 63.2}],
     "Contrastive language-image pretraining that scores how well captions describe a picture.",
     "Rank which of my caption ideas best describes a photo without training a classifier."),
]

PREFIX = {"torchhub": "th", "tensorhub": "tf", "huggingface": "hf"}
FRAMEWORK = {"torchhub": "PyTorch", "tensorhub": "TensorFlow Hub", "huggingface": "Hugging Face Transformers"}
KEY_ARG = {"torchhub": "model", "tensorhub": "handle", "huggingface": "pretrained_model_name_or_path"}


def make_record(hub, row):
    (rid, domain, functionality, api_name, api_call, args, env, example, perf, desc, _instr) = row
    return {
        "id": f"{PREFIX[hub]}-{rid}",
        "domain": domain,
        "framework": FRAMEWORK[hub],
        "functionality": functionality,
        "api_name": api_name,
        "api_call": api_call,
        "api_arguments": args,
        "environment_requirements": env,
        "example_code": example,
        "performance": perf,
        "description": desc,
    }


def hallucinated_call(hub, i):
    if hub == "torchhub":
        return f"model = torch.hub.load('pytorch/vision', 'imaginary_net_{i}', pretrained=True)"
    if hub == "tensorhub":
        return f"layer = hub.KerasLayer('https://tfhub.dev/made-up/model_{i}/1')"
    return f"pipe = pipeline('text-to-video', model='your_model_name_{i}')"


def main():
    hubs = {"torchhub": TORCH, "tensorhub": TF, "huggingface": HF}
    all_records = {}
    for hub, rows in hubs.items():
        records = [make_record(hub, r) for r in rows]
        all_records[hub] = records
        dump_jsonl(DATA / "fixtures" / f"{hub}.jsonl", records)

        examples = []
        truth, mixed = [], []
        for i, (row, rec) in enumerate(zip(rows, records)):
            ex_id = f"{PREFIX[hub]}-ex-{i + 1:03d}"
            examples.append({"id": ex_id, "instruction": row[10], "reference_id": rec["id"], "hub": hub})
            truth.append({"example_id": ex_id, "text": rec["api_call"], "ok": True})
            # Mixed replay: every third output is a wrong real API, every third
            # is invented, the rest are correct; one failure per hub.
            if i == len(rows) - 1:
                mixed.append({"example_id": ex_id, "text": "", "ok": False, "error": "timeout"})
            elif i % 3 == 1:
                other = records[(i + 1) % len(records)]
                mixed.append({"example_id": ex_id, "text": other["api_call"], "ok": True})
            elif i % 3 == 2:
                mixed.append({"example_id": ex_id, "text": hallucinated_call(hub, i), "ok": True})
            else:
                mixed.append({"example_id": ex_id, "text": f"<domain>: {rec['domain']}, <api_call>: {rec['api_call']},", "ok": True})
        dump_jsonl(DATA / "fixtures" / f"{hub}_examples.jsonl", examples)

        header = {"_header": {"provenance": {"kind": "replay", "label": "ground-truth"}}}
        dump_jsonl(DATA / "fixtures" / "replay" / f"{hub}_groundtruth.jsonl", [header] + truth)
        header = {"_header": {"provenance": {"kind": "replay", "label": "mixed-mock"}}}
        dump_jsonl(DATA / "fixtures" / "replay" / f"{hub}_mixed.jsonl", [header] + mixed)

        # Instruction replay keyed by record id (and "<id>#retry").
        instr = []
        for i, (row, rec) in enumerate(zip(rows, records)):
            lines = [f"{k + 1}. {row[10]} (variant {k + 1})" for k in range(10)]
            if i == 0:
                lines[2] = f"3. Use {rec['api_name']} to do this for me."
                retry = [f"{k + 1}. A fresh request about {rec['functionality'].lower()} number {k + 1}" for k in range(10)]
                instr.append({"example_id": rec["id"] + "#retry", "text": "\n".join(retry), "ok": True})
            instr.append({"example_id": rec["id"], "text": "\n".join(lines), "ok": True})
        header = {"_header": {"provenance": {"kind": "replay", "label": "instruction-mock"}}}
        dump_jsonl(DATA / "fixtures" / "replay" / f"{hub}_instructions.jsonl", [header] + instr)

    # Accuracy constraints on the TorchHub examples: ImageNet top-1 >= 80.
    th_examples = [f"th-ex-{i + 1:03d}" for i in range(len(TORCH))]
    constraints = [{"example_id": e, "metric": "top-1 accuracy", "dataset": "ImageNet",
                    "comparator": ">=", "threshold": 80.0} for e in th_examples]
    dump_jsonl(DATA / "fixtures" / "torchhub_constraints.jsonl", constraints)

    # Match specs as loadable data.
    dump_json(DATA / "specs" / "torchhub.json", {"hub": "torchhub", "rules": [
        {"callee": "torch.hub.load", "required": ["repo_or_dir", "model"], "signature": ["repo_or_dir", "model"]}]})
    dump_json(DATA / "specs" / "tensorhub.json", {"hub": "tensorhub", "rules": [
        {"callee": "hub.KerasLayer", "required": ["handle"], "signature": ["handle"]},
        {"callee": "hub.load", "required": ["handle"], "signature": ["handle"]}]})
    hf_rules = [{"callee": "pipeline", "required": ["task"], "checked_if_present": ["model"],
                 "signature": ["task", "model"], "exception": "pipeline-task"}]
    seen = set()
    for rec in all_records["huggingface"]:
        callee = rec["api_call"].split("(")[0]
        if callee == "pipeline" or callee in seen:
            continue
        seen.add(callee)
        hf_rules.append({"callee": callee, "required": ["pretrained_model_name_or_path"],
                         "signature": ["pretrained_model_name_or_path"]})
    dump_json(DATA / "specs" / "huggingface.json", {"hub": "huggingface", "rules": hf_rules})

    seeds = [
        ("torchhub", "I want to recognize handwritten digits on scanned forms.", "torch.hub.load('pytorch/vision', 'resnet34', pretrained=True)"),
        ("torchhub", "Separate the vocals from the backing track of a song.", "torch.hub.load('sigsep/open-unmix-pytorch', 'umxhq')"),
        ("torchhub", "Recognize the action being performed in short sports clips.", "torch.hub.load('facebookresearch/pytorchvideo', 'slow_r50', pretrained=True)"),
        ("torchhub", "Segment cars and pedestrians in dashboard camera frames.", "torch.hub.load('pytorch/vision', 'deeplabv3_mobilenet_v3_large', pretrained=True)"),
        ("torchhub", "Turn a paragraph of text into spoken audio for an audiobook.", "torch.hub.load('snakers4/silero-models', 'silero_tts', language='en', speaker='lj_16khz')"),
        ("torchhub", "Find all the traffic signs in a street view image.", "torch.hub.load('ultralytics/yolov5', 'yolov5m', pretrained=True)"),
        ("tensorhub", "Extract features from product images to build a visual search engine.", "hub.KerasLayer('https://tfhub.dev/google/imagenet/resnet_v2_50/feature_vector/5')"),
        ("tensorhub", "Compute sentence vectors to cluster survey answers.", "hub.load('https://tfhub.dev/google/universal-sentence-encoder-large/5')"),
        ("tensorhub", "Detect people and vehicles in traffic camera images.", "hub.load('https://tfhub.dev/tensorflow/ssd_mobilenet_v2/2')"),
        ("tensorhub", "Estimate the body pose of several dancers in a video frame.", "hub.load('https://tfhub.dev/google/movenet/multipose/lightning/1')"),
        ("tensorhub", "Classify bird songs recorded in the forest.", "hub.load('https://tfhub.dev/google/bird-vocalization-classifier/1')"),
        ("tensorhub", "Label images of food dishes for a recipe app.", "hub.KerasLayer('https://tfhub.dev/google/aiy/vision/classifier/food_V1/1')"),
        ("huggingface", "Answer questions about a scanned invoice.", "pipeline('document-question-answering', model='impira/layoutlm-document-qa')"),
        ("huggingface", "Translate customer chats from French to English.", "AutoModelForSeq2SeqLM.from_pretrained('Helsinki-NLP/opus-mt-fr-en')"),
        ("huggingface", "Generate an illustration from a text description.", "StableDiffusionPipeline.from_pretrained('runwayml/stable-diffusion-v1-5')"),
        ("huggingface", "Write a caption describing a photo.", "VisionEncoderDecoderModel.from_pretrained('nlpconnect/vit-gpt2-image-captioning')"),
        ("huggingface", "Find how similar two sentences are in meaning.", "AutoModel.from_pretrained('sentence-transformers/all-MiniLM-L6-v2')"),
        ("huggingface", "Detect whether speech is present in an audio stream.", "pipeline('voice-activity-detection', model='pyannote/voice-activity-detection')"),
    ]
    dump_jsonl(DATA / "seeds" / "selfinstruct_seeds.jsonl",
               [{"instruction": i, "api_call": c, "hub": h} for h, i, c in seeds])

    for hub in hubs:
        dump_json(DATA / "fixtures" / f"run_{hub}.json", {
            "hub": hub,
            "db": f"{hub}.jsonl",
            "examples": f"{hub}_examples.jsonl",
            "seed": 7,
            "jobs": 2,
        })


if __name__ == "__main__":
    main()
